//! Leg and body geometry for the reconfigurable quadruped.
//!
//! Every leg is a coxa/femur/tibia chain. The coxa rotates about the forward
//! (y) axis; femur and tibia rotate about the lateral (x) axis. Femur and tibia
//! lengths are set by prismatic actuators and carried in [`MorphologyConfig`].
//!
//! Two frames are used for foot positions:
//!
//! * the *leg frame*, origin at the femur pivot, used by [`forward_kinematics`]
//!   and [`inverse_kinematics`];
//! * the *gait frame*, in which ground height and the gait control points are
//!   expressed. Its origin sits [`GAIT_DATUM_HEIGHT`] above the femur pivot, so
//!   a stance foot at [`ground_height`] is `0.8 * (femur + tibia)` below the pivot.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FEMUR_MIN: f64 = 185.0;
pub const FEMUR_MAX: f64 = 210.0;
pub const TIBIA_MIN: f64 = 255.0;
pub const TIBIA_MAX: f64 = 350.0;

/// Height of the gait-frame origin above the femur pivot, in millimeters.
pub const GAIT_DATUM_HEIGHT: f64 = 430.0;

/// Fraction of the summed link length used as stance depth.
pub const STANCE_LENGTH_FRACTION: f64 = 0.8;

/// Default clearance kept from the singular inner and outer reach limits.
pub const DEFAULT_REACH_MARGIN: f64 = 1.0;

/// Femur and tibia lengths (mm) defining the current body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphologyConfig {
    pub femur_length: f64,
    pub tibia_length: f64,
}

impl MorphologyConfig {
    /// Shortest available leg.
    pub const SHORT: Self = Self {
        femur_length: 185.0,
        tibia_length: 255.0,
    };
    /// 80% of the available stroke on both links.
    pub const TALL: Self = Self {
        femur_length: 205.0,
        tibia_length: 331.0,
    };

    pub fn new(femur_length: f64, tibia_length: f64) -> Result<Self> {
        let morph = Self {
            femur_length,
            tibia_length,
        };
        morph.validate()?;
        Ok(morph)
    }

    pub fn validate(&self) -> Result<()> {
        let femur_ok = (FEMUR_MIN..=FEMUR_MAX).contains(&self.femur_length);
        let tibia_ok = (TIBIA_MIN..=TIBIA_MAX).contains(&self.tibia_length);
        if femur_ok && tibia_ok {
            Ok(())
        } else {
            Err(Error::InvalidMorphology {
                femur: self.femur_length,
                tibia: self.tibia_length,
            })
        }
    }

    pub fn leg_length(&self) -> f64 {
        self.femur_length + self.tibia_length
    }

    /// Femur extension above its shortest length, in mm.
    pub fn femur_stroke(&self) -> f64 {
        self.femur_length - FEMUR_MIN
    }

    pub fn tibia_stroke(&self) -> f64 {
        self.tibia_length - TIBIA_MIN
    }
}

/// Body dimensions. Mass is carried as metadata and used only for static load
/// estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyGeometry {
    pub body_length: f64,
    pub body_width: f64,
    pub mass: f64,
}

impl Default for BodyGeometry {
    fn default() -> Self {
        Self {
            body_length: 470.0,
            body_width: 270.0,
            mass: 5.5,
        }
    }
}

/// Legs in body order. Left legs mirror the lateral axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Leg {
    FrontLeft,
    FrontRight,
    RearLeft,
    RearRight,
}

impl Leg {
    pub const ALL: [Leg; 4] = [Leg::FrontLeft, Leg::FrontRight, Leg::RearLeft, Leg::RearRight];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_left(self) -> bool {
        matches!(self, Leg::FrontLeft | Leg::RearLeft)
    }

    pub fn is_front(self) -> bool {
        matches!(self, Leg::FrontLeft | Leg::FrontRight)
    }

    /// Sign that maps a body-frame lateral offset into this leg's
    /// outward-positive lateral axis.
    pub fn lateral_sign(self) -> f64 {
        if self.is_left() {
            -1.0
        } else {
            1.0
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Leg::FrontLeft => "FL",
            Leg::FrontRight => "FR",
            Leg::RearLeft => "RL",
            Leg::RearRight => "RR",
        }
    }
}

impl fmt::Display for Leg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl BodyGeometry {
    /// Hip position of `leg` in the body frame (x lateral, y forward).
    pub fn hip_offset(&self, leg: Leg) -> FootPoint {
        let x = if leg.is_left() { -0.5 } else { 0.5 } * self.body_width;
        let y = if leg.is_front() { 0.5 } else { -0.5 } * self.body_length;
        FootPoint::new(x, y, 0.0)
    }

    pub fn hip_offsets(&self) -> [FootPoint; 4] {
        Leg::ALL.map(|leg| self.hip_offset(leg))
    }
}

/// A position in millimeters: lateral `x` (outward positive), forward `y`,
/// vertical `z` (up positive, so feet are at negative z).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FootPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FootPoint {
    pub const ZERO: Self = Self {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    /// Gait-frame point expressed in the leg frame.
    pub fn gait_to_leg(self) -> Self {
        Self::new(self.x, self.y, self.z + GAIT_DATUM_HEIGHT)
    }

    pub fn leg_to_gait(self) -> Self {
        Self::new(self.x, self.y, self.z - GAIT_DATUM_HEIGHT)
    }
}

impl Add for FootPoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for FootPoint {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for FootPoint {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

impl Neg for FootPoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl fmt::Display for FootPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.3}, {:.3}, {:.3})", self.x, self.y, self.z)
    }
}

/// Revolute joint angles in radians. Zero is the straight leg pointing down.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct JointAngles {
    pub coxa: f64,
    pub femur: f64,
    pub tibia: f64,
}

impl JointAngles {
    pub const fn new(coxa: f64, femur: f64, tibia: f64) -> Self {
        Self { coxa, femur, tibia }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.coxa, self.femur, self.tibia]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

/// Software limits per joint, `[min, max]` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointLimits {
    pub coxa: [f64; 2],
    pub femur: [f64; 2],
    pub tibia: [f64; 2],
}

impl Default for JointLimits {
    /// ±π/2 around the rest pose; the knee rests at a right angle.
    fn default() -> Self {
        Self {
            coxa: [-FRAC_PI_2, FRAC_PI_2],
            femur: [-FRAC_PI_2, FRAC_PI_2],
            tibia: [-PI, 0.0],
        }
    }
}

impl JointLimits {
    pub fn contains(&self, angles: &JointAngles) -> bool {
        let within = |v: f64, [lo, hi]: [f64; 2]| v >= lo && v <= hi;
        within(angles.coxa, self.coxa)
            && within(angles.femur, self.femur)
            && within(angles.tibia, self.tibia)
    }
}

/// Stance height of the foot in the gait frame.
pub fn ground_height(morph: &MorphologyConfig) -> f64 {
    -GAIT_DATUM_HEIGHT - morph.leg_length() * STANCE_LENGTH_FRACTION
}

/// Foot position in the leg frame.
pub fn forward_kinematics(angles: &JointAngles, morph: &MorphologyConfig) -> FootPoint {
    let (femur, tibia) = (morph.femur_length, morph.tibia_length);
    let knee_angle = angles.femur + angles.tibia;
    // Sagittal plane: forward component and (negative) vertical reach.
    let forward = femur * angles.femur.sin() + tibia * knee_angle.sin();
    let down = femur * angles.femur.cos() + tibia * knee_angle.cos();
    FootPoint::new(down * angles.coxa.sin(), forward, -down * angles.coxa.cos())
}

/// Knee-backward inverse kinematics in the leg frame.
pub fn inverse_kinematics(target: &FootPoint, morph: &MorphologyConfig) -> Result<JointAngles> {
    inverse_kinematics_with_margin(target, morph, DEFAULT_REACH_MARGIN)
}

pub fn reach_limits(morph: &MorphologyConfig, margin: f64) -> (f64, f64) {
    let (femur, tibia) = (morph.femur_length, morph.tibia_length);
    ((femur - tibia).abs() + margin, femur + tibia - margin)
}

pub fn is_reachable(target: &FootPoint, morph: &MorphologyConfig, margin: f64) -> bool {
    let (inner, outer) = reach_limits(morph, margin);
    let distance = target.norm();
    distance >= inner && distance <= outer
}

pub fn inverse_kinematics_with_margin(
    target: &FootPoint,
    morph: &MorphologyConfig,
    margin: f64,
) -> Result<JointAngles> {
    let distance = target.norm();
    let (inner, outer) = reach_limits(morph, margin);
    if !(distance >= inner && distance <= outer) {
        return Err(Error::Unreachable {
            target: *target,
            distance,
            limits: (inner, outer),
        });
    }
    let (femur, tibia) = (morph.femur_length, morph.tibia_length);

    // Coxa swings the sagittal plane out to the target's lateral offset.
    let down = target.x.hypot(target.z);
    let coxa = target.x.atan2(-target.z);

    let cos_knee = ((distance * distance - femur * femur - tibia * tibia) / (2.0 * femur * tibia))
        .clamp(-1.0, 1.0);
    let knee = -cos_knee.acos();
    let reach_angle = target.y.atan2(down);
    let femur_angle = reach_angle - (tibia * knee.sin()).atan2(femur + tibia * knee.cos());

    Ok(JointAngles::new(coxa, femur_angle, knee))
}

/// True iff every gait-frame point is reachable by the leg.
pub fn leg_workspace_contains(points: &[FootPoint], morph: &MorphologyConfig) -> bool {
    points
        .iter()
        .all(|p| is_reachable(&p.gait_to_leg(), morph, DEFAULT_REACH_MARGIN))
}
