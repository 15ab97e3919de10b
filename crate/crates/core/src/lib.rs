//! Kinematic simulation of a quadruped with self-reconfigurable leg lengths.
//!
//! The crate is organised bottom-up: [`kinematics`] and [`spline`] supply
//! geometry, [`gait`] turns gait parameters into foot targets, [`actuation`]
//! models the servos and prismatic actuators, [`simulator`] walks the robot
//! through evaluation protocols, and [`experiments`] runs replicated
//! experiment matrices with rank statistics. [`config`] and [`cli`] wire it
//! all to files and the command line.

pub mod actuation;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod gait;
pub mod kinematics;
pub mod registry;
pub mod simulator;
pub mod spline;
pub mod stats;

pub use error::{Error, Result};
